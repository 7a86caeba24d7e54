from django.urls import path
from . import views

urlpatterns = [
    path('', views.list_commands, name='command_list'),
    path('<str:command>/', views.run_command, name='run_command'),
]
